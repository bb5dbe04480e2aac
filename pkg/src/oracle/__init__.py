# Exact Diagonalization Oracle