fn main() {
    eprintln!("drawdensity: command line not wired up yet");
    std::process::exit(2);
}
