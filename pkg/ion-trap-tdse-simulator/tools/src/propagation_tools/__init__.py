# Time propagation tools package
