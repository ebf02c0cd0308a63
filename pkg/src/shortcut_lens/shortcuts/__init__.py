from .dataset import (
    InjectionManifest,
    InjectionRecord,
    build_shortcut_dataset,
    perturb_arrays,
    replay_manifest,
)
from .inject import (
    apply_shortcut,
    disc_mask,
    inject_color_dot,
    inject_location_dot,
    inject_logo,
    inject_watermark,
    ring_anchors,
    watermark_alpha,
)
from .spec import ShortcutSpec, TextPattern

__all__ = [
    "InjectionManifest",
    "InjectionRecord",
    "ShortcutSpec",
    "TextPattern",
    "apply_shortcut",
    "build_shortcut_dataset",
    "disc_mask",
    "inject_color_dot",
    "inject_location_dot",
    "inject_logo",
    "inject_watermark",
    "perturb_arrays",
    "replay_manifest",
    "ring_anchors",
    "watermark_alpha",
]
