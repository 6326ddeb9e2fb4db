// stabaudit command line: drives the audit library through its C API.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>

#include "stabaudit.h"

namespace {

int fail(const char* what, sa_status status) {
  std::fprintf(stderr, "stabaudit: %s failed: %s\n", what, sa_last_error());
  return static_cast<int>(status);
}

int run_audit_command(const std::string& config_path) {
  sa_audit* audit = nullptr;
  sa_status status = sa_audit_open(config_path.c_str(), &audit);
  if (status != SA_OK) return fail("loading config", status);

  const std::string out_dir = sa_audit_output_dir(audit);
  sa_report* report = nullptr;
  status = sa_audit_run(audit, &report);
  if (status != SA_OK) {
    sa_error_manifest_write(out_dir.c_str());
    sa_audit_close(audit);
    return fail("audit", status);
  }
  status = sa_report_write(report, out_dir.c_str());
  sa_report_close(report);
  sa_audit_close(audit);
  if (status != SA_OK) return fail("writing report", status);
  std::printf("report written to %s\n", out_dir.c_str());
  return 0;
}

int run_demo_command(const std::string& scenario, std::uint64_t seed, const std::string& out_dir) {
  sa_report* report = nullptr;
  sa_status status = sa_demo_run(scenario.c_str(), seed, out_dir.c_str(), &report);
  if (status != SA_OK) {
    sa_error_manifest_write(out_dir.c_str());
    return fail("demo", status);
  }
  status = sa_report_write(report, out_dir.c_str());
  sa_report_close(report);
  if (status != SA_OK) return fail("writing report", status);
  std::printf("demo '%s' (seed %llu) written to %s\n", scenario.c_str(),
              static_cast<unsigned long long>(seed), out_dir.c_str());
  return 0;
}

int run_report_command(const std::string& in_path, const std::string& format) {
  sa_report* report = nullptr;
  sa_status status = sa_report_open(in_path.c_str(), &report);
  if (status != SA_OK) return fail("loading report", status);
  char* text = nullptr;
  status = sa_report_render(report, format.c_str(), &text);
  if (status != SA_OK) {
    sa_report_close(report);
    return fail("rendering report", status);
  }
  std::fputs(text, stdout);
  sa_string_free(text);
  sa_report_close(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box stability audits for score-producing decision systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sa_version()));

  std::string config_path;
  auto* audit_cmd = app.add_subcommand("audit", "run an audit described by a config file");
  audit_cmd->add_option("--config", config_path, "path to the audit config (JSON)")->required();

  std::string scenario = "stable";
  std::uint64_t seed = 7;
  std::string demo_out = "demo-out";
  auto* demo_cmd = app.add_subcommand("demo", "generate and audit a synthetic scenario");
  demo_cmd
      ->add_option("--scenario", scenario,
                   "stable | file_format_unstable | discontinuous | linked | drifting | baseline")
      ->required();
  demo_cmd->add_option("--seed", seed, "generator seed (default 7)");
  demo_cmd->add_option("--out", demo_out, "output directory")->required();

  std::string report_in;
  std::string report_format = "text";
  auto* report_cmd = app.add_subcommand("report", "render a machine report as csv or text");
  report_cmd->add_option("--in", report_in, "path to report.json")->required();
  report_cmd->add_option("--format", report_format, "csv | text")
      ->check(CLI::IsMember({"csv", "text"}));

  CLI11_PARSE(app, argc, argv);

  if (audit_cmd->parsed()) return run_audit_command(config_path);
  if (demo_cmd->parsed()) return run_demo_command(scenario, seed, demo_out);
  if (report_cmd->parsed()) return run_report_command(report_in, report_format);
  return static_cast<int>(SA_ERROR_CONFIG);
}
