"""Numerical core: grids, Maxwellians, the Landau operator, torus fields, residuals and time integration."""
