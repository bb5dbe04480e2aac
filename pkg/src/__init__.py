# Near-Unitary Toolkit