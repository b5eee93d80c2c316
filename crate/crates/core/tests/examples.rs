#[path = "../examples/command_line.rs"]
mod command_line;
#[path = "../examples/expressions.rs"]
mod expressions;
#[path = "../examples/foliation.rs"]
mod foliation;
#[path = "../examples/identities.rs"]
mod identities;
#[path = "../examples/meshes.rs"]
mod meshes;
#[path = "../examples/series.rs"]
mod series;
#[path = "../examples/split.rs"]
mod split;
#[path = "../examples/surfaces.rs"]
mod surfaces;
#[path = "../examples/timelike.rs"]
mod timelike;
#[path = "../examples/weierstrass.rs"]
mod weierstrass;

macro_rules! runs {
    ($($name:ident),*) => {$(
        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    )*};
}

runs!(
    command_line,
    expressions,
    foliation,
    identities,
    meshes,
    series,
    split,
    surfaces,
    timelike,
    weierstrass
);
