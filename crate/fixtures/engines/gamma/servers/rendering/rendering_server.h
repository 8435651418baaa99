#pragma once
#include "core/object.h"

// rendering_server
