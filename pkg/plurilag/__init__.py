# Pluri-Lagrangian differential algebra

__version__ = "1.0.0"
