"""Maximum independent set on cubic planar graphs as a 2D nearest-neighbour Ising
ground state, compiled to X-pulse schedules on a bare Ising lattice."""

__version__ = "0.1.0"
