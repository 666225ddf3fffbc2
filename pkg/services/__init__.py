"""Document loading, exports, report assembly and the verification suite."""
