#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bw/csv.hpp"
#include "bw/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Emit a bundled synthetic dataset as CSV"};
  std::string which = "kitchenham_like";
  std::string out;
  uint64_t seed = 7;
  app.add_option("dataset", which, "kitchenham_like or isbsg_like");
  app.add_option("-o,--output", out, "Output file (default: <dataset>.csv)");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  bw::CsvTable table;
  if (which == "kitchenham_like") {
    table = bw::make_kitchenham_like_csv(seed);
  } else if (which == "isbsg_like") {
    table = bw::make_isbsg_like_csv(seed);
  } else {
    std::cerr << "unknown dataset: " << which << "\n";
    return 2;
  }
  if (out.empty()) out = which + ".csv";
  bw::write_csv_file(out, table);
  std::cout << "wrote " << out << " (" << table.rows.size() << " rows)\n";
  return 0;
}
