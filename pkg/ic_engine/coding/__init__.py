"""Index codes, decoders and validity checks."""
