# Trap Bases