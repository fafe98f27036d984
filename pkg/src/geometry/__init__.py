from .kernel import *  # noqa: F401,F403
from .kernel import __all__ as _kernel_all
from src.ir.model import BBox

__all__ = ["BBox", *_kernel_all]
