use proptest::prelude::*;
use zmc_surfaces::catalog::builtin_surface;
use zmc_surfaces::expr::C64;
use zmc_surfaces::meshio::{
    csv_string, obj_string, sample_graph_by_inversion, sample_patch, write_csv, write_obj,
    GridSpec, PatchSource, SurfacePatch, CSV_HEADER,
};
use zmc_surfaces::reps::{we_point, WEData};

fn parse_csv(text: &str) -> Vec<(usize, usize, [f64; 3], bool)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 6, "{l}");
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                [
                    f[2].parse().unwrap(),
                    f[3].parse().unwrap(),
                    f[4].parse().unwrap(),
                ],
                f[5] == "1",
            )
        })
        .collect()
}

fn patch_strategy() -> impl Strategy<Value = SurfacePatch> {
    (1usize..6, 1usize..6).prop_flat_map(|(nu, nv)| {
        prop::collection::vec(
            prop::option::weighted(0.8, prop::array::uniform3(-1e6f64..1e6)),
            nu * nv,
        )
        .prop_map(move |s| SurfacePatch::from_samples(nu, nv, s))
    })
}

proptest! {
    #[test]
    fn csv_round_trips_every_bit(patch in patch_strategy()) {
        let rows = parse_csv(&csv_string(&patch));
        prop_assert_eq!(rows.len(), patch.nu * patch.nv);
        for (k, (i, j, p, valid)) in rows.into_iter().enumerate() {
            prop_assert_eq!((i, j), (k / patch.nv, k % patch.nv));
            prop_assert_eq!(valid, patch.valid[k]);
            if valid {
                prop_assert_eq!(p, patch.points[k]);
            }
        }
    }

    #[test]
    fn obj_lists_valid_vertices_and_quads(patch in patch_strategy()) {
        let text = obj_string(&patch);
        let verts: Vec<[f64; 3]> = text
            .lines()
            .filter_map(|l| l.strip_prefix("v "))
            .map(|l| {
                let c: Vec<f64> = l.split(' ').map(|s| s.parse().unwrap()).collect();
                [c[0], c[1], c[2]]
            })
            .collect();
        let faces: Vec<Vec<usize>> = text
            .lines()
            .filter_map(|l| l.strip_prefix("f "))
            .map(|l| l.split(' ').map(|s| s.parse().unwrap()).collect())
            .collect();
        prop_assert_eq!(verts.len(), patch.valid_count());
        prop_assert_eq!(faces.len(), patch.quads().len());
        let valid_points: Vec<[f64; 3]> = patch
            .points
            .iter()
            .zip(&patch.valid)
            .filter(|(_, v)| **v)
            .map(|(p, _)| *p)
            .collect();
        prop_assert_eq!(verts, valid_points);
        for f in faces {
            prop_assert_eq!(f.len(), 4);
            prop_assert!(f.iter().all(|i| (1..=patch.valid_count()).contains(i)));
        }
    }

    #[test]
    fn grid_display_round_trips(
        u0 in -10.0f64..10.0, du in 0.001f64..10.0, nu in 2usize..50,
        v0 in -10.0f64..10.0, dv in 0.001f64..10.0, nv in 2usize..50,
        margin in 0.0f64..0.5,
    ) {
        let g = GridSpec::with_margin((u0, u0 + du, nu), (v0, v0 + dv, nv), margin).unwrap();
        let back: GridSpec = g.to_string().parse().unwrap();
        prop_assert_eq!(g, back);
    }
}

#[test]
fn grid_points_hit_both_ends() {
    let g: GridSpec = "-pi/2:pi/2:5,0:1:3".parse().unwrap();
    let pts = g.points();
    assert_eq!(pts.len(), 15);
    assert_eq!(pts[0], (-std::f64::consts::FRAC_PI_2, 0.0));
    assert_eq!(pts[14], (std::f64::consts::FRAC_PI_2, 1.0));
    assert!("0:1:3".parse::<GridSpec>().is_err());
    assert!("0:1:x,0:1:3".parse::<GridSpec>().is_err());
}

#[test]
fn height_sampling_masks_the_singular_lines() {
    let s = builtin_surface("scherk2").unwrap();
    let g: GridSpec = "-2:2:41,-1:1:11,0.05".parse().unwrap();
    let patch = sample_patch(&PatchSource::Height(&s), &g).unwrap();
    for (k, (x, y)) in g.points().into_iter().enumerate() {
        assert_eq!(patch.valid[k], x.cos() > 0.05, "({x}, {y})");
    }
}

#[test]
fn inversion_sampling_reproduces_enneper_heights() {
    let data = WEData::enneper();
    let g: GridSpec = "-0.5:0.5:9,-0.5:0.5:9".parse().unwrap();
    let (patch, zetas) = sample_graph_by_inversion(&data, &g, C64::new(0.0, 0.0)).unwrap();
    assert_eq!(patch.valid_count(), g.len());
    for (k, zeta) in zetas.iter().enumerate() {
        let p = we_point(&data, *zeta).unwrap();
        assert!((p[0] - patch.points[k][0]).abs() < 1e-10);
        assert!((p[1] - patch.points[k][1]).abs() < 1e-10);
        assert_eq!(p[2], patch.points[k][2]);
    }
}

#[test]
fn files_are_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let patch = SurfacePatch::from_samples(2, 2, vec![Some([0.0, 0.0, 1.0]); 4]);
    let (obj, csv) = (dir.path().join("p.obj"), dir.path().join("p.csv"));
    write_obj(&patch, &obj).unwrap();
    write_csv(&patch, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&obj).unwrap(), obj_string(&patch));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), csv_string(&patch));
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "{names:?}");
}
