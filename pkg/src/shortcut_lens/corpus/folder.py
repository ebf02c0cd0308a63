"""Image-folder datasets: `root/<split>/<class>/*.png`.

Handles are eager: images live in memory as uint8 (N, C, H, W), which
keeps training and injection deterministic and fast for desk-scale
corpora. Iteration order is sorted (class name, then file name).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import DatasetError
from ..seeding import rng_for

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def to_float(images_u8: np.ndarray) -> np.ndarray:
    """uint8 [0,255] -> float32 [0,1]."""
    return images_u8.astype(np.float32) / 255.0


def to_uint8(images: np.ndarray) -> np.ndarray:
    """float [0,1] -> uint8 via round-half-even; float64 math keeps n/255 exact."""
    return np.rint(np.asarray(images, dtype=np.float64) * 255.0).astype(np.uint8)


@dataclass(frozen=True)
class DatasetHandle:
    """A loaded split with verified class/count metadata."""

    root: Path
    split: str
    class_names: tuple[str, ...]
    ids: tuple[str, ...]  # split-relative, e.g. "cat/0001.png"
    labels: np.ndarray = field(repr=False)  # int64 (N,)
    images: np.ndarray = field(repr=False)  # uint8 (N, C, H, W)
    transforms: tuple[str, ...] = ()

    @property
    def image_count(self) -> int:
        return len(self.ids)

    @property
    def image_shape(self) -> tuple[int, int, int]:
        return tuple(self.images.shape[1:])

    def load_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(float32 images in [0,1], int64 labels)."""
        return to_float(self.images), self.labels.copy()

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.class_names))

    def checksum(self) -> str:
        """Content digest over (ids, labels, pixels); stable across sessions."""
        import hashlib

        h = hashlib.blake2b(digest_size=16)
        for img_id in self.ids:
            h.update(img_id.encode())
        h.update(self.labels.tobytes())
        h.update(self.images.tobytes())
        return h.hexdigest()


def _decode(path: Path, grayscale: bool, resize: int | None) -> np.ndarray:
    with Image.open(path) as im:
        im = im.convert("L" if grayscale else "RGB")
        if resize is not None:
            im = im.resize((resize, resize), Image.BILINEAR)
        arr = np.asarray(im, dtype=np.uint8)
    if arr.ndim == 2:
        arr = arr[None]
    else:
        arr = np.moveaxis(arr, -1, 0)
    return arr


def load_dataset(path: str | Path, split: str, *, grayscale: bool = False,
                 resize: int | None = None,
                 classes: tuple[str, ...] | None = None) -> DatasetHandle:
    """Load one split of an image-folder dataset.

    `classes` restricts to a subset of class folders (e.g. a two-class
    analog); `grayscale` converts with Rec. 601 luma via PIL mode "L".
    """
    root = Path(path)
    split_dir = root / split
    if not split_dir.is_dir():
        raise DatasetError(f"missing split directory: {split_dir}")
    class_dirs = sorted(d for d in split_dir.iterdir() if d.is_dir())
    if classes is not None:
        wanted = set(classes)
        found = {d.name for d in class_dirs}
        missing = wanted - found
        if missing:
            raise DatasetError(f"classes not in {split_dir}: {sorted(missing)}")
        class_dirs = [d for d in class_dirs if d.name in wanted]
    if not class_dirs:
        raise DatasetError(f"no class directories under {split_dir}")

    ids: list[str] = []
    labels: list[int] = []
    arrays: list[np.ndarray] = []
    shape = None
    for label, cdir in enumerate(class_dirs):
        files = sorted(p for p in cdir.iterdir()
                       if p.suffix.lower() in IMAGE_SUFFIXES)
        if not files:
            raise DatasetError(f"empty class folder: {cdir}")
        for p in files:
            arr = _decode(p, grayscale, resize)
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise DatasetError(
                    f"mixed image sizes without resize: {p} is {arr.shape}, "
                    f"expected {shape}"
                )
            arrays.append(arr)
            ids.append(f"{cdir.name}/{p.name}")
            labels.append(label)

    transforms: tuple[str, ...] = ()
    if grayscale:
        transforms += ("grayscale",)
    if resize is not None:
        transforms += (f"resize:{resize}",)
    return DatasetHandle(
        root=root, split=split,
        class_names=tuple(d.name for d in class_dirs),
        ids=tuple(ids), labels=np.asarray(labels, dtype=np.int64),
        images=np.stack(arrays), transforms=transforms,
    )


def subset(handle: DatasetHandle, n_per_class: int, seed: int) -> DatasetHandle:
    """Class-balanced deterministic subsample of exactly n_per_class each."""
    rng = rng_for(seed, "subset")
    keep: list[int] = []
    for label in range(len(handle.class_names)):
        pool = np.flatnonzero(handle.labels == label)
        if len(pool) < n_per_class:
            raise DatasetError(
                f"class {handle.class_names[label]!r} has {len(pool)} images, "
                f"need {n_per_class}"
            )
        chosen = rng.choice(pool, size=n_per_class, replace=False)
        keep.extend(sorted(int(i) for i in chosen))
    idx = np.asarray(keep, dtype=np.int64)
    return DatasetHandle(
        root=handle.root, split=handle.split, class_names=handle.class_names,
        ids=tuple(handle.ids[i] for i in keep),
        labels=handle.labels[idx], images=handle.images[idx],
        transforms=handle.transforms + (f"subset:{n_per_class}@{seed}",),
    )


def write_split(root: str | Path, split: str, class_names: tuple[str, ...],
                images_u8: np.ndarray, labels: np.ndarray,
                ids: list[str] | None = None) -> None:
    """Write a uint8 batch as a PNG image-folder split."""
    root = Path(root)
    if ids is None:
        counters = [0] * len(class_names)
        ids = []
        for lab in labels:
            ids.append(f"{class_names[lab]}/{counters[lab]:05d}.png")
            counters[lab] += 1
    for i, img_id in enumerate(ids):
        path = root / split / img_id
        path.parent.mkdir(parents=True, exist_ok=True)
        arr = images_u8[i]
        if arr.shape[0] == 1:
            im = Image.fromarray(arr[0], mode="L")
        else:
            im = Image.fromarray(np.moveaxis(arr, 0, -1), mode="RGB")
        im.save(path)


def handle_from_arrays(images_u8: np.ndarray, labels: np.ndarray,
                       class_names: tuple[str, ...], split: str = "train",
                       root: str | Path = "memory") -> DatasetHandle:
    """Wrap in-memory arrays as a handle (ids are sequential indices)."""
    ids = tuple(f"{i:06d}" for i in range(images_u8.shape[0]))
    return DatasetHandle(root=Path(root), split=split, class_names=class_names,
                         ids=ids, labels=np.asarray(labels, dtype=np.int64),
                         images=images_u8)
