"""Dataset-level shortcut application and the replayable manifest.

Every image gets its own rng stream derived from (spec.seed, image id),
so injection is order-independent and parallel-safe. The manifest
records each decision; `replay_manifest` reproduces the perturbed
dataset bit-exactly from the clean one without consuming any rng.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..corpus.folder import DatasetHandle, to_float, to_uint8, write_split
from ..errors import InvalidSpecError
from ..seeding import rng_for
from .inject import apply_shortcut, paint, ring_anchors
from .spec import ShortcutSpec

MANIFEST_VERSION = 1


@dataclass(frozen=True)
class InjectionRecord:
    image_id: str
    label: int
    applied: bool
    placement: dict | None
    draw_index: int  # rng values consumed for this image


@dataclass
class InjectionManifest:
    spec: ShortcutSpec
    split: str
    records: list[InjectionRecord]
    version: int = MANIFEST_VERSION

    @property
    def applied_count(self) -> int:
        return sum(1 for r in self.records if r.applied)

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "split": self.split,
            "spec": self.spec.to_json(),
            "images": [
                {
                    "id": r.image_id,
                    "label": r.label,
                    "applied": r.applied,
                    "placement": r.placement,
                    "draw_index": r.draw_index,
                }
                for r in self.records
            ],
        }

    @classmethod
    def from_json(cls, d: dict) -> "InjectionManifest":
        return cls(
            spec=ShortcutSpec.from_json(d["spec"]),
            split=d.get("split", "train"),
            records=[
                InjectionRecord(
                    image_id=r["id"],
                    label=int(r["label"]),
                    applied=bool(r["applied"]),
                    placement=r["placement"],
                    draw_index=int(r["draw_index"]),
                )
                for r in d["images"]
            ],
            version=int(d.get("version", MANIFEST_VERSION)),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path: str | Path) -> "InjectionManifest":
        return cls.from_json(json.loads(Path(path).read_text()))


def _resolve_against(spec: ShortcutSpec, num_classes: int,
                     image_shape: tuple[int, int, int]) -> ShortcutSpec:
    """Fill every data-dependent default so the manifest embeds a concrete spec."""
    spec = spec.resolved(num_classes)
    _, h, w = image_shape
    if spec.kind == "location_dot" and spec.anchor_map is None:
        r = spec.resolve_radius(h, w)
        spec = replace(spec, anchor_map=ring_anchors(num_classes, h, w, r))
    return spec


def perturb_arrays(images: np.ndarray, labels: np.ndarray, spec: ShortcutSpec,
                   ids: list[str] | None = None,
                   num_classes: int | None = None,
                   split: str = "train") -> tuple[np.ndarray, InjectionManifest]:
    """Perturb a float image batch (N, C, H, W); returns (copy, manifest)."""
    n = images.shape[0]
    if ids is None:
        ids = [f"{i:06d}" for i in range(n)]
    if num_classes is None:
        num_classes = int(labels.max()) + 1 if n else 0
    if n and (labels.min() < 0 or labels.max() >= num_classes):
        raise InvalidSpecError(
            f"labels outside 0..{num_classes - 1} for this spec"
        )
    spec = _resolve_against(spec, num_classes, images.shape[1:])
    out = np.empty_like(images)
    records = []
    for i in range(n):
        rng = rng_for(spec.seed, "inject", ids[i])
        out[i], rec = apply_shortcut(images[i], int(labels[i]), spec, rng)
        records.append(InjectionRecord(
            image_id=ids[i], label=int(labels[i]), applied=rec["applied"],
            placement=rec["placement"], draw_index=rec["draws"],
        ))
    return out, InjectionManifest(spec=spec, split=split, records=records)


def build_shortcut_dataset(handle: DatasetHandle, spec: ShortcutSpec,
                           out_root: str | Path | None = None,
                           ) -> tuple[DatasetHandle, InjectionManifest]:
    """Perturb a whole dataset; optionally mirror it to disk with its manifest.

    The clean dataset is untouched. When `out_root` is given the perturbed
    images are written as PNGs in the same split/class layout next to a
    `manifest.json` describing every decision.
    """
    images, labels = handle.load_arrays()
    perturbed, manifest = perturb_arrays(
        images, labels, spec, ids=list(handle.ids),
        num_classes=len(handle.class_names), split=handle.split,
    )
    u8 = to_uint8(perturbed)
    out_handle = DatasetHandle(
        root=Path(out_root) if out_root is not None else handle.root,
        split=handle.split,
        class_names=handle.class_names,
        ids=handle.ids,
        labels=handle.labels.copy(),
        images=u8,
        transforms=handle.transforms + (f"shortcut:{spec.kind}",),
    )
    if out_root is not None:
        out_root = Path(out_root)
        write_split(out_root, handle.split, handle.class_names, u8,
                    handle.labels, ids=list(handle.ids))
        manifest.save(out_root / "manifest.json")
    return out_handle, manifest


def replay_manifest(manifest: InjectionManifest,
                    handle: DatasetHandle) -> DatasetHandle:
    """Re-apply recorded placements to the clean dataset; rng-free."""
    images, labels = handle.load_arrays()
    index = {img_id: i for i, img_id in enumerate(handle.ids)}
    out = to_float(handle.images)
    for rec in manifest.records:
        if rec.image_id not in index:
            raise InvalidSpecError(f"manifest image {rec.image_id!r} not in dataset")
        i = index[rec.image_id]
        if int(labels[i]) != rec.label:
            raise InvalidSpecError(
                f"label mismatch for {rec.image_id!r}: dataset {int(labels[i])}, "
                f"manifest {rec.label}"
            )
        if rec.applied:
            out[i] = paint(images[i], rec.label, manifest.spec, rec.placement)
    return DatasetHandle(
        root=handle.root, split=handle.split, class_names=handle.class_names,
        ids=handle.ids, labels=handle.labels.copy(), images=to_uint8(out),
        transforms=handle.transforms + (f"shortcut:{manifest.spec.kind}",),
    )
