"""CIFAR-10 archive support (full-scale reference experiments).

Reads the standard `cifar-10-batches-py` pickle layout; `fetch_cifar10`
downloads and verifies the published archive checksum.
"""

from __future__ import annotations

import hashlib
import pickle
import tarfile
import urllib.request
from pathlib import Path

import numpy as np

from ..errors import DatasetError
from .folder import DatasetHandle

CIFAR10_URL = "https://www.cs.toronto.edu/~kriz/cifar-10-python.tar.gz"
CIFAR10_MD5 = "c58f30108f718f92721af3b95e74349a"
BATCH_DIR = "cifar-10-batches-py"


def find_cifar_dir(path: str | Path) -> Path | None:
    path = Path(path)
    for candidate in (path, path / BATCH_DIR):
        if (candidate / "data_batch_1").exists():
            return candidate
    return None


def _read_batch(path: Path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, "rb") as f:
        d = pickle.load(f, encoding="bytes")
    data = d[b"data"].reshape(-1, 3, 32, 32).astype(np.uint8)
    labels = np.asarray(d[b"labels"], dtype=np.int64)
    return data, labels


def load_cifar10(path: str | Path, split: str, *, grayscale: bool = False,
                 classes: tuple[str, ...] | None = None) -> DatasetHandle:
    base = find_cifar_dir(path)
    if base is None:
        raise DatasetError(f"no CIFAR-10 batches under {path}")
    with open(base / "batches.meta", "rb") as f:
        meta = pickle.load(f, encoding="bytes")
    names = tuple(n.decode() for n in meta[b"label_names"])

    if split == "train":
        parts = [_read_batch(base / f"data_batch_{i}") for i in range(1, 6)]
    elif split == "test":
        parts = [_read_batch(base / "test_batch")]
    else:
        raise DatasetError(f"unknown split {split!r}")
    images = np.concatenate([p[0] for p in parts])
    labels = np.concatenate([p[1] for p in parts])

    if classes is not None:
        keep_labels = []
        for c in classes:
            if c not in names:
                raise DatasetError(f"class {c!r} not in CIFAR-10 label set")
            keep_labels.append(names.index(c))
        keep_labels.sort()
        mask = np.isin(labels, keep_labels)
        images, labels = images[mask], labels[mask]
        remap = {old: new for new, old in enumerate(keep_labels)}
        labels = np.asarray([remap[int(l)] for l in labels], dtype=np.int64)
        names = tuple(names[i] for i in keep_labels)

    transforms: tuple[str, ...] = ()
    if grayscale:
        # Rec. 601 luma
        f32 = images.astype(np.float32)
        gray = 0.299 * f32[:, 0] + 0.587 * f32[:, 1] + 0.114 * f32[:, 2]
        images = np.rint(gray).astype(np.uint8)[:, None]
        transforms = ("grayscale",)

    ids = tuple(f"{split}/{i:06d}" for i in range(images.shape[0]))
    return DatasetHandle(root=Path(path), split=split, class_names=names,
                         ids=ids, labels=labels, images=images,
                         transforms=transforms)


def fetch_cifar10(dest_dir: str | Path, url: str = CIFAR10_URL) -> Path:
    """Download, md5-verify, and extract the archive; returns the batch dir."""
    dest_dir = Path(dest_dir)
    dest_dir.mkdir(parents=True, exist_ok=True)
    existing = find_cifar_dir(dest_dir)
    if existing is not None:
        return existing
    archive = dest_dir / "cifar-10-python.tar.gz"
    if not archive.exists():
        urllib.request.urlretrieve(url, archive)
    digest = hashlib.md5(archive.read_bytes()).hexdigest()
    if digest != CIFAR10_MD5:
        raise DatasetError(
            f"checksum mismatch for {archive}: got {digest}, want {CIFAR10_MD5}"
        )
    with tarfile.open(archive, "r:gz") as tar:
        tar.extractall(dest_dir)
    found = find_cifar_dir(dest_dir)
    if found is None:
        raise DatasetError(f"archive {archive} did not contain {BATCH_DIR}")
    return found
