fn main() {
    let stdout = std::io::stdout();
    let code = dihedral_parity::cli::dispatch(std::env::args_os(), &mut stdout.lock());
    std::process::exit(code);
}
