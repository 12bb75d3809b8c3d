"""Hall's theorem through a path game: assignments, certificates and hypergraphs."""
