#include "stabaudit.h"

#include <cstdlib>
#include <memory>
#include <cstring>
#include <new>
#include <string>

#include "stabaudit/csv_io.hpp"
#include "stabaudit/demo.hpp"
#include "stabaudit/errors.hpp"
#include "stabaudit/report_io.hpp"

namespace {

thread_local std::string g_last_error = "no error";
thread_local int g_last_class = 0;
thread_local std::string g_last_name = "none";

void record_error(const char* name, int cls, const std::string& message) {
  g_last_name = name;
  g_last_class = cls;
  g_last_error = message;
}

template <typename Fn>
sa_status guarded(Fn&& fn) {
  try {
    fn();
    return SA_OK;
  } catch (const stabaudit::AuditError& e) {
    const int cls = static_cast<int>(stabaudit::error_class(e.code()));
    record_error(stabaudit::errc_name(e.code()), cls, e.what());
    return static_cast<sa_status>(cls);
  } catch (const std::bad_alloc&) {
    record_error("OutOfMemory", SA_ERROR_INTERNAL, "out of memory");
    return SA_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    record_error("Internal", SA_ERROR_INTERNAL, e.what());
    return SA_ERROR_INTERNAL;
  }
}

sa_status invalid_argument(const char* message) {
  record_error("BadConfig", SA_ERROR_CONFIG, message);
  return SA_ERROR_CONFIG;
}

}  // namespace

struct sa_audit {
  stabaudit::AuditConfig config;
};

struct sa_report {
  stabaudit::ReportBundle bundle;
  std::string json_cache;
};

extern "C" {

const char* sa_version(void) { return "0.1.0"; }

const char* sa_last_error(void) { return g_last_error.c_str(); }

sa_status sa_audit_open(const char* config_path, sa_audit** out) {
  if (config_path == nullptr || out == nullptr)
    return invalid_argument("sa_audit_open: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new sa_audit{stabaudit::load_audit_config(config_path)}; });
}

const char* sa_audit_output_dir(const sa_audit* audit) {
  return audit == nullptr ? "" : audit->config.output_dir.c_str();
}

sa_status sa_audit_run(sa_audit* audit, sa_report** out) {
  if (audit == nullptr || out == nullptr) return invalid_argument("sa_audit_run: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<sa_report>(sa_report{stabaudit::run_audit(audit->config), {}});
    report->json_cache = report->bundle.files.at("report.json");
    *out = report.release();
  });
}

void sa_audit_close(sa_audit* audit) { delete audit; }

sa_status sa_demo_run(const char* scenario, uint64_t seed, const char* out_dir, sa_report** out) {
  if (scenario == nullptr || out_dir == nullptr || out == nullptr)
    return invalid_argument("sa_demo_run: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<sa_report>(sa_report{
        stabaudit::run_demo(stabaudit::scenario_from_string(scenario), seed, out_dir), {}});
    report->json_cache = report->bundle.files.at("report.json");
    *out = report.release();
  });
}

sa_status sa_report_write(const sa_report* report, const char* out_dir) {
  if (report == nullptr || out_dir == nullptr)
    return invalid_argument("sa_report_write: NULL argument");
  return guarded([&] {
    if (report->bundle.files.empty()) {
      // a report loaded from JSON carries no plot bytes; write what exists
      stabaudit::ReportBundle minimal;
      minimal.report = report->bundle.report;
      minimal.files["report.json"] = report->json_cache;
      minimal.files["summary.csv"] = stabaudit::report_to_csv(report->bundle.report);
      stabaudit::write_bundle(minimal, out_dir);
    } else {
      stabaudit::write_bundle(report->bundle, out_dir);
    }
  });
}

sa_status sa_report_open(const char* report_json_path, sa_report** out) {
  if (report_json_path == nullptr || out == nullptr)
    return invalid_argument("sa_report_open: NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    try {
      text = stabaudit::read_text_file(report_json_path);
    } catch (const stabaudit::AuditError& e) {
      throw stabaudit::AuditError(stabaudit::Errc::MissingFile, e.what());
    }
    auto report = std::make_unique<sa_report>();
    report->json_cache = std::move(text);
    report->bundle.report = stabaudit::report_from_json(report->json_cache);
    *out = report.release();
  });
}

sa_status sa_report_render(const sa_report* report, const char* format, char** out_text) {
  if (report == nullptr || format == nullptr || out_text == nullptr)
    return invalid_argument("sa_report_render: NULL argument");
  *out_text = nullptr;
  const std::string fmt(format);
  if (fmt != "csv" && fmt != "text")
    return invalid_argument("sa_report_render: format must be 'csv' or 'text'");
  return guarded([&] {
    const std::string rendered = fmt == "csv"
                                     ? stabaudit::report_to_csv(report->bundle.report)
                                     : stabaudit::report_to_text(report->bundle.report);
    char* buffer = static_cast<char*>(std::malloc(rendered.size() + 1));
    if (buffer == nullptr) throw std::bad_alloc();
    std::memcpy(buffer, rendered.c_str(), rendered.size() + 1);
    *out_text = buffer;
  });
}

const char* sa_report_json(const sa_report* report) {
  return report == nullptr ? "" : report->json_cache.c_str();
}

void sa_report_close(sa_report* report) { delete report; }

void sa_string_free(char* text) { std::free(text); }

sa_status sa_error_manifest_write(const char* out_dir) {
  if (out_dir == nullptr) return invalid_argument("sa_error_manifest_write: NULL argument");
  return guarded([&] {
    stabaudit::write_error_manifest(out_dir, g_last_name, g_last_class, g_last_error);
  });
}

}  // extern "C"
