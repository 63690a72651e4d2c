#pragma once

#define PRIMECOH_VERSION "0.1.0"
