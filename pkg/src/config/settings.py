from pydantic import Field, ConfigDict, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path

# 获取项目根目录
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class AIConfig(BaseSettings):
    """大模型接口配置（OpenAI兼容）"""
    AI_API_KEY: str = Field(
        default="",  # 允许空值，离线/模拟模式下不需要
        description="API密钥，只从环境变量读取"
    )
    AI_API_BASE: str = Field("https://api.openai.com/v1", description="OpenAI兼容接口地址")
    AI_MODEL: str = Field("gpt-4.1", description="默认模型名称")
    AI_REQUEST_TIMEOUT: float = Field(120.0, description="单次请求超时(秒)")
    AI_MAX_RETRIES: int = Field(3, description="结构化输出失败后的最大重试次数")
    AI_RETRY_DELAY: float = Field(1.0, description="传输错误重试初始延迟(秒)")
    AI_RETRY_BACKOFF: float = Field(2.0, description="重试延迟倍数")
    AI_TRANSPORT_RETRIES: int = Field(5, description="429/5xx 传输错误最大重试次数")
    AI_MAX_CONCURRENCY: int = Field(4, description="并发请求上限")
    AI_MAX_IMAGE_SIZE: int = Field(10 * 1024 * 1024, description="最大图片大小(bytes)")

    model_config = ConfigDict(
        env_file=".env",
        env_prefix="",  # 不使用前缀，因为属性名已包含前缀
        extra="ignore",
        case_sensitive=True
    )


class LogConfig(BaseSettings):
    """日志配置"""
    LOG_LEVEL: str = Field("INFO", description="日志级别")
    LOG_FILE: str = Field(str(PROJECT_ROOT / "logs/tikzcheck.log"), description="日志文件路径，空字符串表示不写文件")
    LOG_FORMAT: str = Field(
        "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
        "<level>{level: <8}</level> | "
        "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
        "<level>{message}</level>",
        description="日志格式"
    )
    LOG_ROTATION: str = Field("50 MB", description="日志轮转大小")
    LOG_RETENTION: str = Field("10 days", description="日志保留时间")

    model_config = ConfigDict(
        env_file="",  # 禁用环境变量文件
        env_prefix="",
        extra="ignore",
        case_sensitive=True
    )

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v: str) -> str:
        """验证日志级别"""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        v = v.upper()
        if v not in valid_levels:
            import warnings
            warnings.warn(f"无效的日志级别: {v}，使用默认值: INFO")
            return "INFO"
        return v


class Settings(BaseSettings):
    """应用配置"""
    APP_NAME: str = Field("tikzcheck", description="应用名称")
    APP_VERSION: str = Field("0.3.0", description="应用版本")

    # 路径配置
    BASE_DIR: Path = Field(default=PROJECT_ROOT, description="项目根目录")
    PROMPT_DIR: Path = Field(default=PROJECT_ROOT / "resources/prompts", description="提示词模板目录")
    PRICE_FILE: Path = Field(default=PROJECT_ROOT / "resources/prices.json", description="模型价格表")

    # 子配置
    ai: AIConfig = Field(default_factory=AIConfig)
    log: LogConfig = Field(default_factory=LogConfig)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
        env_prefix=""
    )

    def __init__(self, **kwargs):
        # .env 只作为环境变量的补充，进程环境变量优先
        from dotenv import dotenv_values

        env_path = PROJECT_ROOT / ".env"
        env_config = dotenv_values(env_path) if env_path.exists() else {}

        if env_config and "ai" not in kwargs:
            ai_config = {k: v for k, v in env_config.items() if k.startswith("AI_") and v is not None}
            if ai_config:
                kwargs["ai"] = AIConfig(**ai_config)

        if env_config and "log" not in kwargs:
            log_config = {k: v for k, v in env_config.items() if k.startswith("LOG_") and v is not None}
            if log_config:
                kwargs["log"] = LogConfig(**log_config)

        super().__init__(**kwargs)
        self._init_directories()

    def _init_directories(self):
        """初始化日志目录"""
        if self.log.LOG_FILE:
            Path(self.log.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)

    def require_api_key(self) -> str:
        """返回API密钥，未配置时抛出配置错误"""
        if not self.ai.AI_API_KEY:
            from src.utils.exceptions import ConfigError
            raise ConfigError("AI_API_KEY 未设置，请在环境变量或 .env 文件中配置，或使用 --mock 离线运行")
        return self.ai.AI_API_KEY


# 创建全局配置实例
settings = Settings()

# 导出配置实例
__all__ = ["settings", "Settings", "AIConfig", "LogConfig", "PROJECT_ROOT"]
