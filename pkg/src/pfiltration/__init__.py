"""Finite p-group series and the Phi_2 = P_3 criterion."""
