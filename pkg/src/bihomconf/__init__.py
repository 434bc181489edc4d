"""Exact symbolic toolkit for finite free BiHom-Lie conformal superalgebras."""

__version__ = "0.1.0"
