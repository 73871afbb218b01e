"""Protocol execution."""
