use etheta_core::f4::phi_wedge_rank_and_kernel;

#[test]
fn wedge_map_rank_and_kernel() {
    let t = std::time::Instant::now();
    assert_eq!(phi_wedge_rank_and_kernel(), (52, 273));
    eprintln!("rank computation took {:?}", t.elapsed());
}
