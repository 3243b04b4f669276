"""hydranav: a linear dependent type checker, hybrid-system composition
engine, temporal-fragment translator, and sensor-based navigation
simulator with runtime safety monitors."""

__version__ = "0.1.0"
