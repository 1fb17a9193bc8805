//! Workloads shared by the benchmarks.

use hdakit_core::fixtures;
use hdakit_core::paths::{parse_path, Path};
use hdakit_core::precubical::{CellRef, Hda};

/// Named HDAs with one long execution each.
pub fn executions() -> Vec<(&'static str, Hda, Path<CellRef>)> {
    let square = fixtures::filled_square("a", "b");
    let cube = fixtures::cube(["a", "b", "c"]);
    let cubes = fixtures::two_cubes();
    let p = parse_path(&square.complex, "v00 +1 a +2 x -1 t -1 v11").unwrap();
    let q = parse_path(&cube.complex, "0_0_0 +1 a_0_0 +2 a_b_0 +3 a_b_c -1 1_b_c -1 1_1_c -1 1_1_1").unwrap();
    let r = parse_path(&cubes.complex, "0_0_0 +1 0_0_c +1 0_b_c +1 a_b_c -3 a_b_1 +3 a_b_d -1 1_b_d").unwrap();
    vec![("square", square, p), ("cube", cube, q), ("two cubes", cubes, r)]
}

/// HDA pairs for the bisimulation checkers: `(name, left, right)`.
pub fn bisim_pairs() -> Vec<(&'static str, Hda, Hda)> {
    let square = fixtures::filled_square("a", "b");
    let cube = fixtures::cube(["a", "b", "c"]);
    vec![
        ("filled vs hollow", square.clone(), fixtures::hollow_square("a", "b")),
        ("square vs symmetrisation", square.clone(), square.symmetrized(6).unwrap()),
        ("cube vs symmetrisation", cube.clone(), cube.symmetrized(6).unwrap()),
        ("two squares vs skeleton", fixtures::two_squares(), fixtures::cube_skeleton()),
    ]
}
