"""Settings, YAML defaults, logging and error types."""
