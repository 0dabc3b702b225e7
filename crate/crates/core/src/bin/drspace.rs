fn main() {
    std::process::exit(damek_ricci::cli::run(std::env::args_os()));
}
