"""Digital simulation of NV-center nuclear hyperpolarization on superconducting chips."""

__version__ = "0.1.0"
