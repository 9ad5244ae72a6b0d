"""Non-distributive L^p spaces over finite submeasured lattices and exact natural densities."""

__version__ = "0.1.0"
