# Trap model tools package
