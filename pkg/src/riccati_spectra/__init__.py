"""Spectral statistics of random Schrodinger operators via explosion counting.

Subpackages cover: the Riccati diffusion simulator (riccati_core), explosion
point processes (point_process), stationary exit-time integrals
(stationary_analysis), soft-edge scaling maps and density asymptotics
(airy_spectrum), tridiagonal ensembles (tridiag_ensemble), fit statistics
(stat_validation), and the experiment command line (experiment_cli).
"""

__version__ = "0.1.0"
