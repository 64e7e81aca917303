# Optimal control tools package
