"""Cost-sensitive sparse logistic models over layered cost-dependency circuits."""

__version__ = "0.1.0"
