//! Graph distances d_n, their extrapolated limit, geodesic projection, and
//! the multilevel distance.

use fractal_triple::metric::{distance_multilevel, distance_sequence, project_path, shortest_path_distance};
use fractal_triple::presets;

fn main() -> fractal_triple::Result<()> {
    let vicsek = presets::vicsek();
    let seq = distance_sequence(&vicsek, &[0.0, 0.0], &[1.0, 0.0], 6)?;
    println!("vicsek corners (0,0)-(1,0):");
    for (n, d) in seq.rows() {
        println!("  d_{n} = {d:.12}");
    }
    println!("  limit ≈ {:.12} (ratio {:?})", seq.extrapolated, seq.q_estimate);

    let g1 = vicsek.build_graph(1)?;
    let g0 = vicsek.build_graph(0)?;
    let a = g1.find_vertex(&[0.0, 0.0]).expect("corner");
    let b = g1.find_vertex(&[1.0, 0.0]).expect("corner");
    let (len, path) = shortest_path_distance(&g1, a, b)?;
    println!("\nlevel-1 geodesic ({len:.6}):");
    for p in path.points(&g1) {
        println!("  {p:?}");
    }
    println!("projected to level 0: length {}", project_path(&g1, &g0, &path)?.length);

    let y = [8.0 / 9.0, 0.0];
    for n in 0..3 {
        println!(
            "d_({n},∞)((0,0), (8/9,0)) = {:.12}",
            distance_multilevel(&vicsek, &[0.0, 0.0], &y, n, 6)?
        );
    }
    Ok(())
}
