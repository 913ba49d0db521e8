"""Physical constants used throughout the package (SI units)."""

from scipy.constants import epsilon_0, hbar, k as k_B, mu_0

# Magnetic flux quantum h/2e in Wb (CODATA).  All external flux arguments are
# expressed in units of PHI_0; this constant is the single point of conversion.
PHI_0 = 2.067833848e-15

__all__ = ["PHI_0", "epsilon_0", "hbar", "k_B", "mu_0"]
