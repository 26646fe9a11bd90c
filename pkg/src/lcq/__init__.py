"""Numerical toolkit for log-concave functions: Ball bodies, functional
quermassintegrals and Monte Carlo checks of the inequalities relating them."""
from .ballbodies import BallBody, QuadratureSpec, ball_body
from .bodies import Box, Ellipsoid, EuclideanBall, Parallelotope, RadialBody, StarBodyOracle
from .core import (Constant, ExpNorm, FunctionDescriptor, Gaussian, Indicator, PowerLaw, evaluate, from_config,
                   level_set, linear_image, project, restricted, scaled, section, shifted)
from .mc import McEstimate, McSpec
from .quermass import QuermassResult, phi_k, phi_prime_k, psi_k, w_k
from .report import VerificationReport
from .subspace import Subspace
from .verify import REGISTRY, RunConfig, run

__version__ = "0.1.0"
