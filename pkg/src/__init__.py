"""lanestyle - Lane-change decision style clustering and kMC-KNN recognition."""

__version__ = "0.1.0"
