"""
adrx - reversible adsorption receiver channel toolkit

Particle-based Monte Carlo simulation and analytical channel response for a
diffusive molecular channel with a spherical adsorption/desorption receiver.
"""

__version__ = "0.1.0"
