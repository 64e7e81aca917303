# Domain Repository Interfaces (Ports)
