//! Fixtures shared by the benchmarks.

use weld_core::exact_geom::rational::int;
use weld_core::{Coord, PLDisk};

/// A comb with `teeth` downward slots, each one unit wide.
pub fn comb(teeth: i64) -> PLDisk {
    let w = 2 * teeth + 1;
    let mut ring = vec![Coord::from_ints(0, 0)];
    for k in 0..teeth {
        let x = 2 * k + 1;
        ring.push(Coord::from_ints(x, 0));
        ring.push(Coord::from_ints(x, 8));
        ring.push(Coord::from_ints(x + 1, 8));
        ring.push(Coord::from_ints(x + 1, 0));
    }
    ring.push(Coord::from_ints(w, 0));
    ring.push(Coord::from_ints(w, 10));
    ring.push(Coord::new(int(0), int(10)));
    PLDisk::new(ring).expect("comb is simple")
}
