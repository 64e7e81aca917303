# Infrastructure Layer - External Services and Data Access
