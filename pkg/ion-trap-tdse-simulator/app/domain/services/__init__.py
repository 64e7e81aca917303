# Domain Services
