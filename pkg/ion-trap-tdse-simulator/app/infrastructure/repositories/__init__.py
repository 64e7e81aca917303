# Repository Implementations (Adapters)
