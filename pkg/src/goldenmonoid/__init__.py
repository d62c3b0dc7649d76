"""Toolkit for the monoid <L,R | LR^2 = RL^2>: exact golden-ratio
arithmetic, Cayley-graph distances and geodesics, boundary atoms and the
tripled-point order space, hyperbolicity checks, and asynchronous binary
transducers with their nucleus."""

__version__ = "0.1.0"
