"""
Bethe ansatz and Fuchsian equation workbench package
"""
from .main import BetheWorkbench

__all__ = ['BetheWorkbench']
