# Analysis Components