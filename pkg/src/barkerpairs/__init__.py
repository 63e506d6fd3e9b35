"""Wieferich-pair search and arithmetic screening of Barker / circulant Hadamard orders."""

__version__ = "0.1.0"
