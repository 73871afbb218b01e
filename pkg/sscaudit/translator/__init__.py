"""Text rendering, exact decoding and SymV composition."""
