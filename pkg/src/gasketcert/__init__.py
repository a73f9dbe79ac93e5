"""Exact verifier that five Sierpinski gaskets in a row are not self-similar."""

__version__ = "0.1.0"
