"""Zero-temperature Casimir-Lifshitz force between dielectric half-spaces."""
