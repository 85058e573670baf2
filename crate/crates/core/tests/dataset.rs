use heatmap_rrt::dataset::{
    generate_dataset, heatmap_from_image, load_pair, DatasetOptions, Manifest,
};
use heatmap_rrt::gridworld::{decode_map_image, MapKind, MapMeta};
use heatmap_rrt::sampling::HeatmapMeta;

fn small(n_pairs: usize, seed: u64) -> DatasetOptions {
    DatasetOptions {
        n_pairs,
        base_seed: seed,
        width: 64,
        height: 64,
        paths_per_map: 10,
        ..DatasetOptions::default()
    }
}

#[test]
fn dataset_layout_and_determinism() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let opts = small(10, 42);
    let ma = generate_dataset(&opts, a.path(), 1).unwrap();
    let mb = generate_dataset(&opts, b.path(), 4).unwrap();
    assert_eq!(ma, mb);
    assert_eq!(ma.pairs.len(), 10);
    let on_disk = Manifest::load(&a.path().join("manifest.json")).unwrap();
    assert_eq!(on_disk, ma);
    assert_eq!(
        std::fs::read(a.path().join("manifest.json")).unwrap(),
        std::fs::read(b.path().join("manifest.json")).unwrap()
    );

    for entry in &ma.pairs {
        assert!(entry.num_paths_found >= 1);
        let id = &entry.id;
        for suffix in ["_input.png", "_truth.png", "_heat.png", ".json", "_heat.json"] {
            let rel = format!("maps/{id}{suffix}");
            let bytes = std::fs::read(a.path().join(&rel)).unwrap();
            assert_eq!(bytes, std::fs::read(b.path().join(&rel)).unwrap(), "{rel}");
        }
        let input = std::fs::read(a.path().join(&entry.input)).unwrap();
        let truth = std::fs::read(a.path().join(&entry.truth)).unwrap();
        let decoded = decode_map_image(&input).unwrap();
        let q = decoded.query.unwrap();
        assert!(q.start.distance(q.goal) >= 32.0);
        // The truth image decodes as a map too, with identical occupancy.
        assert_eq!(decode_map_image(&truth).unwrap().map.cells(), decoded.map.cells());

        let meta: MapMeta =
            serde_json::from_slice(&std::fs::read(a.path().join(&entry.meta)).unwrap()).unwrap();
        assert_eq!((meta.width, meta.height), (64, 64));
        assert_eq!(meta.kind, entry.kind);
        assert!(MapKind::GENERATED.contains(&meta.kind));
        assert_eq!(meta.start, Some(q.start));
        let side: HeatmapMeta = serde_json::from_slice(
            &std::fs::read(a.path().join(format!("maps/{id}_heat.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(side.normalization, "max255");

        let pair = load_pair(a.path(), entry).unwrap();
        let heat = image::load_from_memory(&std::fs::read(a.path().join(&entry.heat)).unwrap()).unwrap();
        assert_eq!(heat.color(), image::ColorType::L8);
        for (i, &w) in pair.ground_truth.weights().iter().enumerate() {
            assert!(w == 0.0 || !pair.map.cells()[i], "mass on an obstacle");
        }
        let from_truth = heatmap_from_image(&image::load_from_memory(&truth).unwrap()).unwrap();
        assert!(from_truth.support().iter().filter(|&&s| s).count() > 0);
    }
}

#[test]
fn different_seeds_differ() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ma = generate_dataset(&small(2, 1), a.path(), 1).unwrap();
    let mb = generate_dataset(&small(2, 2), b.path(), 1).unwrap();
    assert_ne!(ma.pairs[0].map_seed, mb.pairs[0].map_seed);
}

#[test]
fn invalid_options_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_dataset(&small(0, 1), dir.path(), 1).is_err());
    let custom = DatasetOptions { kinds: vec![MapKind::Custom], ..small(1, 1) };
    assert!(generate_dataset(&custom, dir.path(), 1).is_err());
}
