use linkey::linkey::hardware_size_bytes;
use linkey::Preset;

fn main() {
    for p in Preset::ALL {
        let (at, cat) = p.entries();
        println!("{:<20} AT {at:>5}  CAT {cat:>5}  {:>9} bytes", p.name(), p.hardware_size_bytes());
    }
    // any power-of-two sizing works
    let bytes = hardware_size_bytes(128, 512).unwrap();
    println!("{:<20} AT {:>5}  CAT {:>5}  {bytes:>9} bytes", "custom", 128, 512);
    assert!(hardware_size_bytes(100, 512).is_err());
}
