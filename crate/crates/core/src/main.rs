fn main() {
    std::process::exit(infogeom::cli::main_entry());
}
