# Data Transfer Objects (DTOs)
