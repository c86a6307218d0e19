fn main() {
    std::process::exit(nc_orlicz::cli::dispatch(std::env::args_os()));
}
