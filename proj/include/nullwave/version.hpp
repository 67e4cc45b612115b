#pragma once

#define NULLWAVE_VERSION_MAJOR 1
#define NULLWAVE_VERSION_MINOR 0
#define NULLWAVE_VERSION_PATCH 0
#define NULLWAVE_VERSION "1.0.0"
