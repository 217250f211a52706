"""Solving linear difference equations in the algebra of harmonic sums."""
