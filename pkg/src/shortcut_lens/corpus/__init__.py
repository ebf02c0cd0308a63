from .cifar import fetch_cifar10, find_cifar_dir, load_cifar10
from .folder import (
    DatasetHandle,
    handle_from_arrays,
    load_dataset,
    subset,
    to_float,
    to_uint8,
    write_split,
)
from .synthetic import CLASS_NAMES, generate_shapes_corpus, render_shape, shapes_handle

__all__ = [
    "CLASS_NAMES",
    "DatasetHandle",
    "fetch_cifar10",
    "find_cifar_dir",
    "generate_shapes_corpus",
    "handle_from_arrays",
    "load_cifar10",
    "load_dataset",
    "render_shape",
    "shapes_handle",
    "subset",
    "to_float",
    "to_uint8",
    "write_split",
]
