"""Error-rate analysis and simulation of RIS-aided space shift keying under
imperfect channel state information."""

__version__ = "0.1.0"
