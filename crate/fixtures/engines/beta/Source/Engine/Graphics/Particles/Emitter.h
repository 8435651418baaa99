#pragma once
#include <Engine/Scene/Node.h>
#include <Engine/Resource/Cache.h>

// Emitter
