"""Rigid quadrangulations of the disk: bijections with colorful labeled
quadrangulations, exact enumeration, uniform sampling, and rendering."""

__version__ = "0.1.0"
