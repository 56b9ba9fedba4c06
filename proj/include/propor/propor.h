/*
 * propor C API.
 *
 * Scenarios and reports are opaque handles owned by the caller and released
 * with the matching *_free function. Every fallible call returns a
 * propor_status; on failure propor_last_error() and propor_last_error_path()
 * describe the problem for the calling thread until its next API call.
 */
#ifndef PROPOR_PROPOR_H
#define PROPOR_PROPOR_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(PROPOR_BUILDING_LIBRARY)
#define PROPOR_API __declspec(dllexport)
#else
#define PROPOR_API __declspec(dllimport)
#endif
#else
#define PROPOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum propor_status {
  PROPOR_OK = 0,
  PROPOR_ERR_VALIDATION = 1, /* bad scenario, act, axis or parameter value */
  PROPOR_ERR_IO = 2,         /* file could not be read */
  PROPOR_ERR_ARGUMENT = 3,   /* null handle/pointer or out-of-range index */
  PROPOR_ERR_INTERNAL = 4
} propor_status;

typedef enum propor_variant {
  PROPOR_VARIANT_BASE = 0,
  PROPOR_VARIANT_EXTENDED = 1
} propor_variant;

typedef enum propor_format {
  PROPOR_FORMAT_TABLE = 0,
  PROPOR_FORMAT_CSV = 1
} propor_format;

/* Harshness rank; silence sorts below every strategy. */
typedef enum propor_strategy {
  PROPOR_SILENCE = -1,
  PROPOR_OFF_RECORD = 0,
  PROPOR_NEGATIVE_POLITENESS = 1,
  PROPOR_POSITIVE_POLITENESS = 2,
  PROPOR_BALD_ON_RECORD = 3
} propor_strategy;

typedef struct propor_act {
  int strategy; /* propor_strategy */
  double conveyed_severity;
  int has_explicit_face_threat;
  double explicit_face_threat;
} propor_act;

typedef struct propor_utility {
  double moral;
  double social;
  double total;
  double face_threat;
} propor_utility;

typedef struct propor_scenario propor_scenario;
typedef struct propor_report propor_report;

PROPOR_API const char* propor_version(void);
PROPOR_API const char* propor_last_error(void);
PROPOR_API const char* propor_last_error_path(void);

/* Scenario documents (JSON, format_version 1). */
PROPOR_API propor_status propor_scenario_parse(const char* text, size_t length,
                                               propor_scenario** out);
PROPOR_API propor_status propor_scenario_load(const char* path, propor_scenario** out);
PROPOR_API void propor_scenario_free(propor_scenario* scenario);
/* Canonical text; release with propor_string_free. */
PROPOR_API propor_status propor_scenario_serialize(const propor_scenario* scenario,
                                                   char** out_text);
PROPOR_API void propor_string_free(char* text);
PROPOR_API propor_status propor_scenario_set_grid_step(propor_scenario* scenario,
                                                       double grid_step);
PROPOR_API size_t propor_scenario_observer_count(const propor_scenario* scenario);
PROPOR_API int propor_scenario_has_episode(const propor_scenario* scenario);

/* "silence", "strategy:severity" or "strategy:severity:face_threat". */
PROPOR_API propor_status propor_parse_act(const char* text, propor_act* out);

PROPOR_API propor_status propor_face_threat(const propor_scenario* scenario,
                                            const propor_act* act, double* out);
PROPOR_API propor_status propor_derive_importance(double violator_rank, double observer_rank,
                                                  double* out);
PROPOR_API propor_status propor_utility_of(const propor_scenario* scenario,
                                           propor_variant variant, const propor_act* act,
                                           propor_utility* out);

/* Reports. Evaluate with act == NULL scores the full candidate set. */
PROPOR_API propor_status propor_evaluate(const propor_scenario* scenario, propor_variant variant,
                                         const propor_act* act, propor_report** out);
PROPOR_API propor_status propor_select(const propor_scenario* scenario, propor_variant variant,
                                       propor_report** out);
/* axis_spec: "name=v1,v2,..." or "name=start:stop:step". */
PROPOR_API propor_status propor_sweep(const propor_scenario* scenario, propor_variant variant,
                                      const char* axis_spec, propor_report** out);
/* Requires the document to carry an episode block. */
PROPOR_API propor_status propor_simulate(const propor_scenario* scenario, propor_variant variant,
                                         propor_report** out);

/* The text stays valid until the report is freed. */
PROPOR_API propor_status propor_report_render(const propor_report* report, propor_format format,
                                              const char** out_text, size_t* out_length);
/* Rows: ranked candidates (select/evaluate), sweep rows, or episode rounds.
 * For select, row 0 is the chosen act. */
PROPOR_API size_t propor_report_row_count(const propor_report* report);
PROPOR_API propor_status propor_report_row(const propor_report* report, size_t index,
                                           propor_act* act, propor_utility* utility);
PROPOR_API void propor_report_free(propor_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PROPOR_PROPOR_H */
