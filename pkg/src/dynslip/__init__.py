"""Dynamic slip channel flows: closed-form spectral solutions, monotone
constitutive graphs, a Galerkin time stepper and a finite-difference oracle."""

__version__ = "0.1.0"
