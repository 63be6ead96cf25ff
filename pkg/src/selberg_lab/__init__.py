"""Numerical laboratory for the Selberg trace formula on the modular surface."""

from .kernels import BACKEND as kernel_backend  # noqa: F401

