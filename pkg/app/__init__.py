"""snowlab: SNOW 1.0 / 2.0 / 3G keystream generators and an analysis lab."""

__version__ = "1.0.0"
