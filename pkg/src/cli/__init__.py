"""CLI module - Bethe/Fuchs workbench"""
from .main import app as bethe_fuchs_app

__all__ = [
    "bethe_fuchs_app",
]
