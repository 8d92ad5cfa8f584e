//! Command line front end.

/// Run the command line interface on the given arguments, returning the
/// process exit code and the textual report.
pub fn run(args: &[String]) -> (u8, String) {
    let _ = args;
    (2, "usage: reflective <levels|genera|eisenstein|knapsack|construct|cusps|special-cusp|verify>\n".to_string())
}
