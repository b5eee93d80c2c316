fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(zmc_surfaces::cli::run(&argv));
}
