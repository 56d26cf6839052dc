"""Phonon-process suppression in nanostructured rare-earth-doped crystals.

Submodules
----------
materials      parameter sets, constants and config files
spin_dynamics  spin-flip rates and spectral-diffusion linewidths
lamb_modes     eigenmodes of a free elastic sphere
dos            particle and Debye densities of states
bands1d        band gaps of a 1D bilayer phononic lattice
cli            command-line front end
"""

__version__ = "0.1.0"
