//! Holds the `acceptance` test target, which checks the toolkit end to end and prints one
//! PASS/FAIL line per criterion.
