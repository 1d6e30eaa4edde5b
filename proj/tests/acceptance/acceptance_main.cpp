#include <iostream>

#include "CLI11.hpp"
#include "zslab/error.hpp"
#include "zslab/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string tier = "full";
  int threads = 1;
  std::vector<int> only;
  bool json = false;
  app.add_option("--tier", tier, "quick or full");
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion ids")->delimiter(',');
  app.add_flag("--json", json);
  CLI11_PARSE(app, argc, argv);

  zslab::VerifyOptions options;
  try {
    options.tier = zslab::parse_tier(tier);
  } catch (const zslab::InvalidArgument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  options.search.parallel.threads = threads;
  options.only = only;

  std::cout << "tier " << zslab::tier_name(options.tier) << std::endl;
  int failed = 0;
  nlohmann::json report = nlohmann::json::array();
  zslab::verify_paper(options, [&](const zslab::CriterionResult& r) {
    if (!r.pass()) ++failed;
    std::cout << zslab::format_result(r) << "  (" << r.seconds << " s)" << std::endl;
    report.push_back(r.to_json(true));
  });
  if (json) std::cout << report.dump(2) << "\n";
  std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
