# Coupling Coefficients