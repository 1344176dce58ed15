//! Small reference profiles shared by tests, examples and the CLI.

use crate::profile::Profile;

/// Five voters over candidates a..e (numbered 1..5):
///
/// ```text
/// a > b > c > d > e
/// a > b > c > d > e
/// d > a > e > c > b
/// d > a > e > c > b
/// c > e > b > d > a
/// ```
///
/// No candidate is a Condorcet winner. Candidate c (3) needs four swaps and
/// candidate d (4) needs two deletions under the strict convention.
pub const EX5_ROWS: [[usize; 5]; 5] =
    [[1, 2, 3, 4, 5], [1, 2, 3, 4, 5], [4, 1, 5, 3, 2], [4, 1, 5, 3, 2], [3, 5, 2, 4, 1]];

pub fn ex5() -> Profile {
    Profile::new(&EX5_ROWS, 5).expect("EX5 is a valid profile")
}
