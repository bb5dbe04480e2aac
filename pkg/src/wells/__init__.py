# Permutations and Wells