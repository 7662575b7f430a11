//! Holds the `acceptance` test target, which checks every end-to-end
//! criterion of `flybot-core` and prints one PASS/FAIL line for each.
//! Run it with `cargo test -p flybot-validation --test acceptance`.
