"""powersurf - critical points of p4 on the power-sum surfaces p1=0, p2=1, p3=C."""

__version__ = "0.1.0"
