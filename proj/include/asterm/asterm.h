// Copyright 2026 The asterm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASTERM_ASTERM_H
#define ASTERM_ASTERM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ASTERM_API __declspec(dllexport)
#else
#define ASTERM_API __attribute__((visibility("default")))
#endif

typedef enum asterm_status {
  ASTERM_OK = 0,
  ASTERM_E_PARSE = 1,
  ASTERM_E_SEMANTIC = 2,
  ASTERM_E_MODEL = 3,
  ASTERM_E_RESOURCE = 4,
  ASTERM_E_INVALID_ARGUMENT = 5,
  ASTERM_E_IO = 6,
  ASTERM_E_UNSUPPORTED = 7,
  ASTERM_E_INTERNAL = 8
} asterm_status;

typedef struct asterm_program asterm_program;
typedef struct asterm_space asterm_space;
typedef struct asterm_report asterm_report;

/* Message of the last failed call on this thread; "" if none. */
ASTERM_API const char* asterm_last_error(void);
ASTERM_API const char* asterm_version(void);
ASTERM_API void asterm_string_free(char* s);

/* Programs */
ASTERM_API asterm_status asterm_program_load(const char* path, asterm_program** out);
ASTERM_API asterm_status asterm_program_compile(const char* text, asterm_program** out);
ASTERM_API void asterm_program_free(asterm_program* p);
ASTERM_API const char* asterm_program_name(const asterm_program* p);
ASTERM_API int asterm_program_is_deterministic(const asterm_program* p);
ASTERM_API size_t asterm_program_location_count(const asterm_program* p);

/* State spaces. `instance` is "N=3,K=1" or NULL; node_cap 0 keeps the default. */
ASTERM_API asterm_status asterm_space_build(const asterm_program* p, const char* instance,
                                            size_t node_cap, asterm_space** out);
ASTERM_API void asterm_space_free(asterm_space* s);
ASTERM_API size_t asterm_space_size(const asterm_space* s);
ASTERM_API asterm_status asterm_space_dump(const asterm_space* s, char** out);

/* Analyses on a built space. */
ASTERM_API asterm_status asterm_as_terminating(const asterm_space* s, int* terminating);
ASTERM_API asterm_status asterm_check_simple(const asterm_space* s, const char* word,
                                             int* terminating);

#define ASTERM_REFINE_PROVEN 0
#define ASTERM_REFINE_REFUTED 1
#define ASTERM_REFINE_BUDGET 2

/* `word` receives the proven pattern word (free with asterm_string_free), or NULL. */
ASTERM_API asterm_status asterm_refine(const asterm_space* s, const char* base, size_t rounds,
                                       int* outcome, char** word);
ASTERM_API asterm_status asterm_monte_carlo(const asterm_space* s, uint64_t samples,
                                            uint64_t step_cap, uint64_t seed, unsigned jobs,
                                            uint64_t* terminated, uint64_t* capped);

/* Commands. A report is produced for every well-formed request; its exit code
   is 0 proven, 1 refuted, 2 inconclusive, 3 input error. */
#define ASTERM_TAIL_DEFAULT 0
#define ASTERM_TAIL_REPEAT 1
#define ASTERM_TAIL_FREE 2

typedef struct asterm_check_options {
  const char* file;
  const char* const* instances; /* each "N=a..b" or "N=a" */
  size_t instance_count;
  const char* base_word;
  size_t rounds;
  size_t node_cap;
  int oracle;
  uint64_t seed;
  unsigned jobs;
  int tail;
  const char* pattern;
} asterm_check_options;

typedef struct asterm_instrument_options {
  const char* file;
  const char* pattern;
  const char* index_param;
  int tail;
  const char* out;
} asterm_instrument_options;

typedef struct asterm_simulate_options {
  const char* file;
  const char* const* instances;
  size_t instance_count;
  uint64_t samples;
  uint64_t step_cap;
  uint64_t seed;
  unsigned jobs;
  size_t node_cap;
} asterm_simulate_options;

ASTERM_API void asterm_check_options_init(asterm_check_options* o);
ASTERM_API void asterm_instrument_options_init(asterm_instrument_options* o);
ASTERM_API void asterm_simulate_options_init(asterm_simulate_options* o);

ASTERM_API asterm_status asterm_cmd_check(const asterm_check_options* o, asterm_report** out);
ASTERM_API asterm_status asterm_cmd_instrument(const asterm_instrument_options* o,
                                               asterm_report** out);
ASTERM_API asterm_status asterm_cmd_simulate(const asterm_simulate_options* o,
                                             asterm_report** out);
/* Uses file, instances, instance_count and node_cap. */
ASTERM_API asterm_status asterm_cmd_dump(const asterm_simulate_options* o, asterm_report** out);

ASTERM_API int asterm_report_exit_code(const asterm_report* r);
ASTERM_API const char* asterm_report_text(const asterm_report* r);
ASTERM_API void asterm_report_free(asterm_report* r);

#ifdef __cplusplus
}
#endif

#endif
