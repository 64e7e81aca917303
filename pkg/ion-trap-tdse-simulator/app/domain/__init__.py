# Domain Layer - Business Logic and Entities
# This layer contains the core business logic and is framework-independent
