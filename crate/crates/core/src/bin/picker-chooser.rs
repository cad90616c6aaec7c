fn main() {
    std::process::exit(picker_chooser::cli::run(std::env::args_os()));
}
