use hamex_core::embedding::{find_embedding_with_genus, GenusSearchOutcome};
use hamex_core::generators::petersen_graph;
use hamex_core::ham::{min_added_edges, verify_certificate, MinEdgesOutcome, decide_ham_extendable, DeciderOutcome};

#[test]
fn probe() {
    let g = petersen_graph();
    let out = find_embedding_with_genus(&g, 1, 1_000_000).unwrap();
    let GenusSearchOutcome::Found(emb) = out else { panic!("not found: {out:?}") };
    let s = emb.stats().unwrap();
    println!("PETERSEN TORUS: p={} q={} r={} genus={}", s.p, s.q, s.r, s.genus);
    let faces = emb.trace_faces().unwrap();
    for w in faces.walks() {
        println!("  face {:?} len {}", w.id, w.len());
    }
    let t0 = std::time::Instant::now();
    match min_added_edges(&emb, 100_000_000).unwrap() {
        MinEdgesOutcome::Found { k, certificate } => {
            println!("MIN ADDED EDGES: {k} ({:?})", t0.elapsed());
            let (ok, reasons) = verify_certificate(&emb, &certificate);
            println!("verified: {ok} {reasons:?}");
            println!("cert chords: {:?}", certificate.chords);
            println!("cert cycle: {:?}", certificate.cycle);
        }
        other => println!("min: {other:?}"),
    }
    let t1 = std::time::Instant::now();
    match decide_ham_extendable(&emb, 100_000_000).unwrap() {
        DeciderOutcome::Yes(c) => println!("decide YES with {} chords ({:?})", c.chords.len(), t1.elapsed()),
        o => println!("decide: {o:?}"),
    }
}
