# Output Components