# Grid simulation and qubit encoding tools package
