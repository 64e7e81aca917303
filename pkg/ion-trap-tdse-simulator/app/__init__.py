# Trapped-ion simulator application layer (clean architecture)
