"""Numerical laboratory for the degenerate elliptic operator that sums the
k smallest eigenvalues of the Hessian.

Subpackages cover: the matrix-level operator (:mod:`~trunclap.operators`),
reaction terms and piecewise profiles (:mod:`~trunclap.nonlinearities`,
:mod:`~trunclap.profiles`), a weak-solution verification engine
(:mod:`~trunclap.viscosity`), a radial ODE solver with quadrature oracle
(:mod:`~trunclap.radial`), grid certificates for a principal-eigenvalue bound
on collapsing plane domains (:mod:`~trunclap.eigenbound`), and a monotone
wide-stencil finite-difference solver (:mod:`~trunclap.fdlab`).
"""

__version__ = "0.1.0"
