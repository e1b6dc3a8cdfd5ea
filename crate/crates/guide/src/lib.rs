//! Runs the book chapters as doctests.
